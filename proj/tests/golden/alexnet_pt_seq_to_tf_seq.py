# Generated by nnmig 0.1.0: pt/seq -> tf/seq
# pivot fnv1a64: 1cdce797ecc78bfa

import tensorflow as tf
from tensorflow import keras
from tensorflow.keras import layers

INPUT_SHAPE = (32, 32, 3)  # channel-last, batch excluded


def build_AlexNet():
    return keras.Sequential([
        layers.Input(shape=INPUT_SHAPE),
        layers.ZeroPadding2D(padding=1, name='conv1_pad'),
        layers.Conv2D(64, 3, strides=2, activation='relu', name='conv1'),
        layers.MaxPooling2D(pool_size=2, name='pool1'),
        layers.ZeroPadding2D(padding=1, name='conv2_pad'),
        layers.Conv2D(192, 3, activation='relu', name='conv2'),
        layers.MaxPooling2D(pool_size=2, name='pool2'),
        layers.ZeroPadding2D(padding=1, name='conv3_pad'),
        layers.Conv2D(384, 3, activation='relu', name='conv3'),
        layers.ZeroPadding2D(padding=1, name='conv4_pad'),
        layers.Conv2D(256, 3, activation='relu', name='conv4'),
        layers.ZeroPadding2D(padding=1, name='conv5_pad'),
        layers.Conv2D(256, 3, activation='relu', name='conv5'),
        layers.MaxPooling2D(pool_size=2, name='pool3'),
        layers.Flatten(name='flatten'),
        layers.Dropout(0.5, name='drop1'),
        layers.Dense(4096, activation='relu', name='fc1'),
        layers.Dropout(0.5, name='drop2'),
        layers.Dense(4096, activation='relu', name='fc2'),
        layers.Dropout(0.5, name='drop3'),
        layers.Dense(10, name='fc3'),
    ], name='AlexNet')


def train(model, x_train, y_train):
    model.compile(
        optimizer=keras.optimizers.Adam(learning_rate=0.001),
        loss=keras.losses.SparseCategoricalCrossentropy(from_logits=True),
        metrics=[],
    )
    model.fit(x_train, y_train, batch_size=64, epochs=10)
    return model


def evaluate(model, x_test, y_test):
    return model.evaluate(x_test, y_test, batch_size=64)


def load_datasets():
    train_set = keras.utils.image_dataset_from_directory('data/cifar10/train', image_size=(32, 32))
    return train_set
